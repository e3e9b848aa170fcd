package com.example.auth;

import java.util.Base64;
import javax.crypto.Cipher;

public class TokenService {
    private final Cipher cipher;
    private final TokenStore store;

    public TokenService(Cipher cipher, TokenStore store) {
        this.cipher = cipher;
        this.store = store;
    }

    public String issue(String userId, String refreshToken) throws Exception {
        byte[] sealed = cipher.doFinal(refreshToken.getBytes());
        String encoded = Base64.getEncoder().encodeToString(sealed);
        store.save(userId, encoded);
        return encoded;
    }
}
