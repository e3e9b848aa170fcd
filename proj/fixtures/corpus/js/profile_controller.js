import express from 'express';
import { logger } from '../lib/logger';

const router = express.Router();

router.put('/profile/:id', async (req, res) => {
  const phoneNumber = normalizePhone(req.body.phone);
  const profile = await Profile.findById(req.params.id);
  profile.updatePhone(phoneNumber);
  await profile.save();
  logger.info('profile updated', req.params.id);
  res.sendStatus(204);
});

export default router;
