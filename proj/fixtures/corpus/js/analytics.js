const Analytics = require('analytics-node');
const analytics = new Analytics(process.env.SEGMENT_KEY);

function trackLogin(user, ipAddress) {
  analytics.identify({ userId: user.id, traits: { email: user.email } });
  analytics.track({ userId: user.id, event: 'login', properties: { ip: ipAddress } });
}

module.exports = { trackLogin };
