package com.example.health;

import java.util.List;

public class PatientService {
    private final PatientRepository repository;
    private final AuditLog audit;

    public PatientService(PatientRepository repository, AuditLog audit) {
        this.repository = repository;
        this.audit = audit;
    }

    public void admit(Patient patient, String diagnosis) {
        patient.setDiagnosis(diagnosis);
        repository.save(patient);
        audit.log("admitted " + patient.getId());
    }

    public List<Patient> discharge(long id) {
        Patient patient = repository.findById(id);
        repository.delete(patient);
        return repository.findAll();
    }
}
