export class NotificationService {
  constructor(private readonly sms: SmsGateway, private readonly log: Logger) {}

  async sendCode(phone: string, otp: string): Promise<void> {
    await this.sms.send(phone, `Your code is ${otp}`);
    this.log.info(`sent code to ${phone}`);
  }
}
