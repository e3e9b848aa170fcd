package com.example.data;

import java.sql.Connection;
import java.sql.PreparedStatement;

public class CustomerRepository {
    private final Connection connection;

    public CustomerRepository(Connection connection) {
        this.connection = connection;
    }

    public void insert(String firstName, String lastName, String taxId) throws Exception {
        try (PreparedStatement ps = connection.prepareStatement("INSERT INTO customers VALUES (?, ?, ?)")) {
            ps.setString(1, firstName);
            ps.setString(2, lastName);
            ps.setString(3, taxId);
            ps.executeUpdate();
        }
    }
}
