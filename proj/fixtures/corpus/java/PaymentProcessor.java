package com.example.billing;

import java.security.MessageDigest;

public class PaymentProcessor {
    private final Gateway gateway;

    public PaymentProcessor(Gateway gateway) {
        this.gateway = gateway;
    }

    public Receipt pay(Order order, String cardNumber, String cvv) throws Exception {
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        byte[] cardHash = md.digest(cardNumber.getBytes());
        Charge charge = gateway.createCharge(order.getTotal(), cardNumber, cvv);
        System.out.println("charged " + order.getId());
        return new Receipt(charge.getId(), cardHash);
    }
}
