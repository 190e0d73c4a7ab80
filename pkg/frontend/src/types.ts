/** Wire types mirroring the scoring service's payloads. */

export interface CriterionInfo {
  key: string;
  name: string;
  /** Anchor texts for levels 1 through 5, in that order. */
  anchors: string[];
}

export interface IU {
  id: string;
  name: string;
  description: string;
  description_source: string;
  created_at: string;
  tags: string[];
}

export interface CriterionScoreWire {
  level: number;
  rationale: string;
}

export interface Revision {
  iu_id: string;
  revision_no: number;
  scores: Record<string, CriterionScoreWire>;
  composite: number;
  raw_sum: number;
  recorded_at: string;
  note: string;
}

export interface RankEntry {
  iu_id: string;
  composite: number;
}

export interface Substitution {
  criterion: string;
  level: number;
}

export interface WhatifResponse {
  iu_id: string;
  substitutions: Substitution[];
  composite: number;
  raw_sum: number;
  delta: number;
  base_revision_no: number;
  base_composite: number;
}

export interface TaiResponse {
  iu_id: string;
  flagged: boolean;
  reasons: string[];
  reason: string;
}
