const keytar = require('keytar');

async function storeApiKey(service, apiKey) {
  const encrypted = vault.encrypt(apiKey);
  await keytar.setPassword(service, 'default', encrypted);
}

module.exports = { storeApiKey };
