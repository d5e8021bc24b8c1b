import * as fs from "fs";
import * as os from "os";
import * as path from "path";
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { main } from "../src/cli.js";
import { sidecarPath } from "../src/schema.js";

let tmp: string;
let stderr: string[];
let stdout: string[];

beforeEach(() => {
  tmp = fs.mkdtempSync(path.join(os.tmpdir(), "cli-"));
  stderr = [];
  stdout = [];
  vi.spyOn(process.stderr, "write").mockImplementation((chunk: any) => {
    stderr.push(String(chunk));
    return true;
  });
  vi.spyOn(process.stdout, "write").mockImplementation((chunk: any) => {
    stdout.push(String(chunk));
    return true;
  });
  vi.spyOn(console, "warn").mockImplementation(() => {});
});

afterEach(() => {
  fs.rmSync(tmp, { recursive: true, force: true });
  vi.restoreAllMocks();
});

function write(name: string, content: string): string {
  const p = path.join(tmp, name);
  fs.writeFileSync(p, content);
  return p;
}

const PROFILES = JSON.stringify([
  {
    user_community: 0,
    size: 40,
    sectors: [
      { hashtag_community: 0, theme: "football", count: 8 },
      { hashtag_community: 1, theme: "political", count: 5 },
    ],
  },
  { user_community: 1, size: 12, sectors: [] },
]);

function networkFixture() {
  return {
    edges: write("edges.csv", "src,dst,weight\nhub,s0,3.0\nhub,s1,1.0\nhub,s2,2.0\n"),
    partition: write("partition.csv", "node,community\nhub,0\ns0,0\ns1,1\ns2,1\n"),
    centrality: write("centrality.csv", "node,score\nhub,0.55\ns0,0.2\ns1,0.15\ns2,0.1\n"),
  };
}

describe("render cli", () => {
  it("renders a polar figure with a sidecar", () => {
    const profiles = write("profiles.json", PROFILES);
    const out = path.join(tmp, "fig.svg");
    const rc = main(["--kind", "polar", "--in", profiles, "--community", "0", "--out", out]);
    expect(rc).toBe(0);
    expect(fs.existsSync(out)).toBe(true);
    const sidecar = JSON.parse(fs.readFileSync(sidecarPath(out), "utf-8"));
    const counts = new Map(sidecar.sectors.map((s: any) => [s.hashtag_community, s.count]));
    expect(counts.get(0)).toBe(8);
    expect(counts.get(1)).toBe(5);
  });

  it("treats an empty profile as a no-op success", () => {
    const profiles = write("profiles.json", PROFILES);
    const out = path.join(tmp, "empty.svg");
    const rc = main(["--kind", "polar", "--in", profiles, "--community", "1", "--out", out]);
    expect(rc).toBe(0);
    expect(fs.existsSync(out)).toBe(false);
  });

  it("asks for --community when the file has several profiles", () => {
    const profiles = write("profiles.json", PROFILES);
    const rc = main(["--kind", "polar", "--in", profiles, "--out", path.join(tmp, "f.svg")]);
    expect(rc).toBe(1);
    expect(stderr.join("")).toContain("--community");
  });

  it("renders a network figure with monotone sizes", () => {
    const { edges, partition, centrality } = networkFixture();
    const out = path.join(tmp, "net.svg");
    const rc = main([
      "--kind", "network",
      "--in", edges, "--in", partition, "--in", centrality,
      "--out", out,
    ]);
    expect(rc).toBe(0);
    const sidecar = JSON.parse(fs.readFileSync(sidecarPath(out), "utf-8"));
    const bySc = [...sidecar.nodes].sort((a: any, b: any) => a.score - b.score);
    for (let i = 1; i < bySc.length; i++) {
      expect(bySc[i].size).toBeGreaterThan(bySc[i - 1].size);
    }
  });

  it("tolerates the command name as a positional", () => {
    const profiles = write("profiles.json", PROFILES);
    const out = path.join(tmp, "fig.svg");
    const rc = main(["render", "--kind", "polar", "--in", profiles, "--community", "0", "--out", out]);
    expect(rc).toBe(0);
  });

  it("rejects an unknown kind", () => {
    const rc = main(["--kind", "pie", "--in", "x.json", "--out", "y.svg"]);
    expect(rc).toBe(1);
    expect(stderr.join("")).toContain("unknown kind");
  });

  it("rejects a missing --out", () => {
    expect(main(["--kind", "polar", "--in", "x.json"])).toBe(1);
  });

  it("rejects the wrong --in count for network", () => {
    const rc = main(["--kind", "network", "--in", "edges.csv", "--out", "y.svg"]);
    expect(rc).toBe(1);
    expect(stderr.join("")).toContain("three --in");
  });

  it("reports invalid artifacts as exit 1", () => {
    const { edges, centrality } = networkFixture();
    const partition = write("bad.csv", "node,community\nhub,0\n");
    const rc = main(["--kind", "network", "--in", edges, "--in", partition, "--in", centrality, "--out", path.join(tmp, "n.svg")]);
    expect(rc).toBe(1);
    expect(stderr.join("")).toContain("id mismatch");
  });

  it("reports a missing input file as exit 2", () => {
    const rc = main(["--kind", "polar", "--in", path.join(tmp, "nope.json"), "--out", path.join(tmp, "f.svg")]);
    expect(rc).toBe(2);
  });

  it("prints usage on --help", () => {
    expect(main(["--help"])).toBe(0);
    expect(stdout.join("")).toContain("usage: render");
  });

  it("rejects unknown flags", () => {
    expect(main(["--kind", "polar", "--frame", "x"])).toBe(1);
  });
});
