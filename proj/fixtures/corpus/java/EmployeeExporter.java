package com.example.hr;

import java.io.Writer;
import java.util.List;

public class EmployeeExporter {
    public void export(List<Employee> employees, Writer out, HttpClient client) throws Exception {
        StringBuilder sb = new StringBuilder();
        for (Employee e : employees) {
            sb.append(e.getFullName()).append(';').append(e.getSalary()).append('\n');
        }
        out.write(sb.toString());
        client.upload("/hr/export", sb.toString());
    }
}
