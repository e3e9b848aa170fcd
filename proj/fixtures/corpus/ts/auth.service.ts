import * as bcrypt from 'bcrypt';
import { Injectable } from '@nestjs/common';

@Injectable()
export class AuthService {
  constructor(private readonly users: UsersRepository) {}

  async validateUser(username: string, password: string): Promise<User | null> {
    const user = await this.users.findOne({ where: { username } });
    if (user && (await bcrypt.compare(password, user.passwordHash))) {
      return user;
    }
    return null;
  }
}
