package com.example.jobs;

import java.time.Instant;
import java.util.List;

public class AccountCleanupJob implements Runnable {
    private final AccountRepository accounts;
    private final Mailer mailer;

    public AccountCleanupJob(AccountRepository accounts, Mailer mailer) {
        this.accounts = accounts;
        this.mailer = mailer;
    }

    @Override
    public void run() {
        List<Account> stale = accounts.findInactiveSince(Instant.now().minusSeconds(31536000));
        for (Account account : stale) {
            mailer.send(account.getEmailAddress(), "Your account will be removed");
            accounts.purge(account.getAccountId());
        }
    }
}
