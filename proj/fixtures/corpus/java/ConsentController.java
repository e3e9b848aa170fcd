package com.example.web;

import java.util.Locale;

public class ConsentController {
    private final ConsentService consents;
    private final MessageSource messages;

    public ConsentController(ConsentService consents, MessageSource messages) {
        this.consents = consents;
        this.messages = messages;
    }

    public String banner(Locale locale) {
        String text = messages.format("consent.banner", locale);
        return text;
    }

    public void accept(HttpServletRequest request, String userId) {
        consents.store(userId, request.getRemoteAddr());
    }
}
