const db = require('./db');

async function savePatient(patient) {
  const diagnosis = patient.diagnosis.trim();
  await db.query('INSERT INTO patients (name, diagnosis) VALUES ($1, $2)', [patient.name, diagnosis]);
}

async function deletePatient(patientId) {
  await db.query('DELETE FROM patients WHERE id = $1', [patientId]);
}

module.exports = { savePatient, deletePatient };
