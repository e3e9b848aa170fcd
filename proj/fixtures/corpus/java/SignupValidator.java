package com.example.auth;

import java.util.regex.Pattern;

public final class SignupValidator {
    private static final Pattern EMAIL = Pattern.compile("^[^@]+@[^@]+$");

    private SignupValidator() {}

    public static boolean isValid(String email, String password, int age) {
        if (!EMAIL.matcher(email).matches()) {
            return false;
        }
        if (password.length() < 12) {
            return false;
        }
        return age >= 16;
    }
}
