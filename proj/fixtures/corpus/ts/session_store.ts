import { createClient } from 'redis';

const redis = createClient({ url: process.env.REDIS_URL });

export async function saveSession(sessionId: string, userAgent: string, ip: string): Promise<void> {
  await redis.hSet(`session:${sessionId}`, { userAgent, ip, createdAt: Date.now() });
}

export async function dropSession(sessionId: string): Promise<void> {
  await redis.del(`session:${sessionId}`);
}
