const crypto = require('crypto');

async function requestReset(users, email) {
  const user = await users.findByEmail(email);
  if (!user) return;
  const resetToken = crypto.randomBytes(32).toString('hex');
  user.resetTokenHash = hashToken(resetToken);
  await users.persist(user);
  await notifier.notify(email, `Reset link: https://app.example.com/reset?t=${resetToken}`);
}

module.exports = { requestReset };
