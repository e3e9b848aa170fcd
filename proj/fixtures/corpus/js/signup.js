const bcrypt = require('bcrypt');
const mailer = require('./mailer');

async function signup(req, res) {
  const { email, password } = req.body;
  const passwordHash = await bcrypt.hash(password, 12);
  const account = await accounts.create({ email, passwordHash });
  await mailer.sendWelcome(email);
  res.status(201).json({ id: account.id });
}

module.exports = { signup };
