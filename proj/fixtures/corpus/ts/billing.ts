export async function updateBilling(accounts: AccountService, accountId: string, iban: string) {
  const normalized = iban.replace(/\s+/g, '').toUpperCase();
  if (!ibanValidator.check(normalized)) {
    throw new BadRequestException('invalid IBAN');
  }
  await accounts.updateBankAccount(accountId, normalized);
}
