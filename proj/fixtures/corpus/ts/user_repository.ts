import { Pool } from 'pg';

export interface UserRow {
  id: number;
  username: string;
  dateOfBirth: string;
}

export class UserRepository {
  constructor(private readonly pool: Pool) {}

  async insert(username: string, dateOfBirth: Date): Promise<void> {
    await this.pool.query('INSERT INTO users(username, dob) VALUES($1, $2)', [username, dateOfBirth.toISOString()]);
  }

  async remove(username: string): Promise<void> {
    await this.pool.query('DELETE FROM users WHERE username = $1', [username]);
  }
}
