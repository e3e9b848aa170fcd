import { MongoClient } from 'mongodb';

const client = new MongoClient(process.env.MONGO_URL);
const users = client.db('app').collection('users');

export async function onboard(req) {
  const { username, email, birthDate } = req.body;
  const passportNumber = req.body.passport;
  await users.insertOne({ username, email });
  logger.debug('onboarding', username);
  const ageCheck = verifier.validate(birthDate);
  await kyc.upload(passportNumber);
  const digest = hasher.digest(email);
  return { ageCheck: ageCheck.ok, digest };
}
