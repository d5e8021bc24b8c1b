/**
 * Readers for the pipeline's exported artifacts. The engine writes plain
 * sorted CSV (edge lists `src,dst,weight`, partitions `node,community`,
 * centrality tables `node,score`) and JSON (engagement profiles). Figures
 * are read-only consumers: nothing here mutates or rewrites an artifact.
 */
import * as fs from "fs";

export class ValidationError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ValidationError";
  }
}

export interface EdgeRow {
  src: string;
  dst: string;
  weight: number;
}

export interface Sector {
  hashtag_community: number;
  theme: string;
  count: number;
}

export interface EngagementProfile {
  user_community: number;
  size: number;
  sectors: Sector[];
}

function splitCsv(text: string, path: string, header: string[]): string[][] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new ValidationError(`${path}: empty file, expected header ${header.join(",")}`);
  }
  const got = lines[0].split(",");
  if (got.length !== header.length || header.some((name, i) => got[i] !== name)) {
    throw new ValidationError(
      `${path}: expected header ${header.join(",")}, got ${lines[0]}`,
    );
  }
  const rows: string[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new ValidationError(`${path}:${i + 1}: expected ${header.length} columns`);
    }
    rows.push(cells);
  }
  return rows;
}

function parseNumber(cell: string, path: string, line: number): number {
  const value = Number(cell);
  if (!Number.isFinite(value)) {
    throw new ValidationError(`${path}:${line}: not a number: ${cell}`);
  }
  return value;
}

export function readEdges(path: string): EdgeRow[] {
  const rows = splitCsv(fs.readFileSync(path, "utf-8"), path, ["src", "dst", "weight"]);
  return rows.map((cells, i) => ({
    src: cells[0],
    dst: cells[1],
    weight: parseNumber(cells[2], path, i + 2),
  }));
}

export function readPartition(path: string): Map<string, number> {
  const rows = splitCsv(fs.readFileSync(path, "utf-8"), path, ["node", "community"]);
  const out = new Map<string, number>();
  for (let i = 0; i < rows.length; i++) {
    out.set(rows[i][0], parseNumber(rows[i][1], path, i + 2));
  }
  return out;
}

export function readCentrality(path: string): Map<string, number> {
  const rows = splitCsv(fs.readFileSync(path, "utf-8"), path, ["node", "score"]);
  const out = new Map<string, number>();
  for (let i = 0; i < rows.length; i++) {
    out.set(rows[i][0], parseNumber(rows[i][1], path, i + 2));
  }
  return out;
}

function checkProfile(value: any, path: string): EngagementProfile {
  if (typeof value !== "object" || value === null || !Array.isArray(value.sectors)) {
    throw new ValidationError(`${path}: not an engagement profile object`);
  }
  for (const sector of value.sectors) {
    if (
      typeof sector.hashtag_community !== "number" ||
      typeof sector.theme !== "string" ||
      typeof sector.count !== "number"
    ) {
      throw new ValidationError(
        `${path}: sector needs hashtag_community, theme, count`,
      );
    }
  }
  return value as EngagementProfile;
}

/**
 * Load one profile from an engagement_profiles.json export. The file holds
 * a JSON array (one entry per user community); a bare object is accepted
 * too. With several entries the caller must pick one by user_community.
 */
export function readProfile(path: string, community?: number): EngagementProfile {
  const parsed = JSON.parse(fs.readFileSync(path, "utf-8"));
  if (!Array.isArray(parsed)) {
    return checkProfile(parsed, path);
  }
  if (parsed.length === 0) {
    throw new ValidationError(`${path}: no profiles in file`);
  }
  if (community === undefined) {
    if (parsed.length > 1) {
      const available = parsed.map((p: any) => p.user_community).join(", ");
      throw new ValidationError(
        `${path}: ${parsed.length} profiles, pick one with --community (available: ${available})`,
      );
    }
    return checkProfile(parsed[0], path);
  }
  for (const entry of parsed) {
    if (entry.user_community === community) {
      return checkProfile(entry, path);
    }
  }
  throw new ValidationError(`${path}: no profile for user community ${community}`);
}

/** Sidecar path for an image: fig.svg -> fig.sidecar.json. */
export function sidecarPath(imagePath: string): string {
  const stripped = imagePath.replace(/\.[^./\\]+$/, "");
  return stripped + ".sidecar.json";
}
