const redis = require('redis');
const client = redis.createClient();

async function hit(req) {
  const ip = req.ip;
  const count = await client.incr(`rl:${ip}`);
  if (count === 1) await client.expire(`rl:${ip}`, 60);
  return count <= 100;
}

module.exports = { hit };
