import winston from 'winston';

const log = winston.createLogger({ level: 'info' });

export function auditLogin(username: string, ip: string, success: boolean): void {
  log.info(`login ${success ? 'ok' : 'failed'} for ${username} from ${ip}`);
  if (!success) {
    log.warn('failed login', { username });
  }
}
