/**
 * Guidance interaction flow, UI-framework-free so tests can drive it the
 * same way the canvas pointer handler does: propose a configuration, show
 * the service-side validity verdict, then commit or discard.
 */

import { Api, GuidanceResponse } from "./api.js";

export interface CandidateState {
  configuration: number[];
  verdict: GuidanceResponse | null; // null while the preview is in flight
}

export class GuidanceFlow {
  candidate: CandidateState | null = null;

  constructor(private api: Api, private sessionId: string) {}

  /** Preview a configuration (a clicked cell / slider pose). */
  async propose(configuration: number[]): Promise<GuidanceResponse> {
    this.candidate = { configuration, verdict: null };
    const verdict = await this.api.previewGuidance(this.sessionId, configuration);
    // a newer proposal may have superseded this one while awaiting
    if (this.candidate?.configuration === configuration) {
      this.candidate.verdict = verdict;
    }
    return verdict;
  }

  /** Commit the current candidate; returns the service's accept/reject. */
  async confirm(): Promise<GuidanceResponse> {
    if (!this.candidate) throw new Error("no candidate guidance to confirm");
    const result = await this.api.submitGuidance(
      this.sessionId,
      this.candidate.configuration,
    );
    if (result.accepted) this.candidate = null;
    return result;
  }

  async decline(): Promise<GuidanceResponse> {
    this.candidate = null;
    return this.api.decline(this.sessionId);
  }

  clear(): void {
    this.candidate = null;
  }
}
