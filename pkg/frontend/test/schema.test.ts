import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterEach, beforeEach, describe, expect, it } from "vitest";
import {
  readCentrality,
  readEdges,
  readPartition,
  readProfile,
  ValidationError,
} from "../src/schema.js";

let tmp: string;

beforeEach(() => {
  tmp = fs.mkdtempSync(path.join(os.tmpdir(), "schema-"));
});

afterEach(() => {
  fs.rmSync(tmp, { recursive: true, force: true });
});

function write(name: string, content: string): string {
  const p = path.join(tmp, name);
  fs.writeFileSync(p, content);
  return p;
}

describe("csv readers", () => {
  it("parses the engine's edge list format", () => {
    const p = write("edges.csv", "src,dst,weight\na,b,2.0\nb,c,0.5\n");
    expect(readEdges(p)).toEqual([
      { src: "a", dst: "b", weight: 2.0 },
      { src: "b", dst: "c", weight: 0.5 },
    ]);
  });

  it("accepts CRLF line endings", () => {
    const p = write("edges.csv", "src,dst,weight\r\na,b,1.0\r\n");
    expect(readEdges(p)).toHaveLength(1);
  });

  it("rejects a wrong header, naming both headers", () => {
    const p = write("edges.csv", "source,target,w\na,b,1\n");
    expect(() => readEdges(p)).toThrowError(ValidationError);
    expect(() => readEdges(p)).toThrowError(/expected header src,dst,weight.*source,target,w/);
  });

  it("rejects a short row with its line number", () => {
    const p = write("part.csv", "node,community\na,0\nb\n");
    expect(() => readPartition(p)).toThrowError(/part.csv:3/);
  });

  it("rejects non-numeric values", () => {
    const p = write("cent.csv", "node,score\na,high\n");
    expect(() => readCentrality(p)).toThrowError(/not a number: high/);
  });

  it("rejects an empty file", () => {
    const p = write("edges.csv", "");
    expect(() => readEdges(p)).toThrowError(/empty file/);
  });
});

describe("readProfile", () => {
  const profile = (community: number) => ({
    user_community: community,
    size: 5,
    sectors: [{ hashtag_community: 0, theme: "other", count: 2 }],
  });

  it("takes the only entry of a one-profile array", () => {
    const p = write("profiles.json", JSON.stringify([profile(4)]));
    expect(readProfile(p).user_community).toBe(4);
  });

  it("accepts a bare profile object", () => {
    const p = write("profile.json", JSON.stringify(profile(2)));
    expect(readProfile(p).user_community).toBe(2);
  });

  it("selects by user community", () => {
    const p = write("profiles.json", JSON.stringify([profile(0), profile(3)]));
    expect(readProfile(p, 3).user_community).toBe(3);
  });

  it("demands a selector when several profiles exist", () => {
    const p = write("profiles.json", JSON.stringify([profile(0), profile(3)]));
    expect(() => readProfile(p)).toThrowError(/available: 0, 3/);
  });

  it("rejects an unknown community", () => {
    const p = write("profiles.json", JSON.stringify([profile(0)]));
    expect(() => readProfile(p, 9)).toThrowError(/no profile for user community 9/);
  });

  it("rejects a malformed sector", () => {
    const p = write("profiles.json", JSON.stringify([{ user_community: 0, size: 1, sectors: [{ theme: "x" }] }]));
    expect(() => readProfile(p)).toThrowError(ValidationError);
  });

  it("rejects an empty array", () => {
    const p = write("profiles.json", "[]");
    expect(() => readProfile(p)).toThrowError(/no profiles/);
  });
});
