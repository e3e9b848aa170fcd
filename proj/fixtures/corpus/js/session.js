const jwt = require('jsonwebtoken');

function issueSession(res, userId, sessionId) {
  const accessToken = jwt.sign({ sub: userId, sid: sessionId }, process.env.JWT_SECRET);
  res.cookie('sid', sessionId, { httpOnly: true });
  return accessToken;
}

function verifySession(req) {
  const authToken = req.headers.authorization.split(' ')[1];
  return jwt.verify(authToken, process.env.JWT_SECRET);
}

module.exports = { issueSession, verifySession };
