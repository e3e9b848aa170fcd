export interface KycRequest {
  nationalId: string;
  driverLicense?: string;
}

export async function submitKyc(http: HttpClient, req: KycRequest): Promise<string> {
  const payload = { id: req.nationalId, dl: req.driverLicense ?? null };
  const res = await http.request('POST', '/kyc', payload);
  return res.reference;
}
