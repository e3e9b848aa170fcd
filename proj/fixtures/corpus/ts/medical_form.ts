export class MedicalForm {
  private allergies: string[] = [];

  addAllergy(name: string): void {
    this.allergies.push(name);
  }

  submit(client: ApiClient, patientId: string): Promise<Response> {
    return client.post(`/patients/${patientId}/allergies`, { allergies: this.allergies });
  }
}
