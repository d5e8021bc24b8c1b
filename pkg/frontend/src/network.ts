/**
 * Force-directed network figure. Node color comes from the community
 * partition, node size from the centrality table (area scales with the
 * score, so radius is a sqrt scale and stays monotone in the column).
 * Layout runs headless: a fixed number of ticks, then coordinates are
 * fitted into the viewport. d3-force seeds its own deterministic RNG, so
 * identical inputs give identical layouts.
 */
import * as fs from "fs";
import {
  forceCenter,
  forceLink,
  forceManyBody,
  forceSimulation,
  SimulationLinkDatum,
  SimulationNodeDatum,
} from "d3-force";
import { scaleLinear, scaleSqrt } from "d3-scale";
import { EdgeRow, ValidationError, sidecarPath } from "./schema.js";
import { communityColors } from "./palette.js";

export interface NetworkOptions {
  width?: number;
  height?: number;
  iterations?: number;
  sizeRange?: [number, number];
}

interface LayoutNode extends SimulationNodeDatum {
  id: string;
  community: number;
  score: number;
}

export interface NetworkNodeOut {
  id: string;
  community: number;
  color: string;
  score: number;
  size: number;
  x: number;
  y: number;
}

export interface NetworkSidecar {
  kind: "network_layout";
  n_nodes: number;
  n_edges: number;
  nodes: NetworkNodeOut[];
}

export interface RenderedNetwork {
  svg: string;
  sidecar: NetworkSidecar;
}

const fmt = (x: number) => (Math.round(x * 100) / 100).toString();

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function checkIds(
  ids: string[],
  partition: Map<string, number>,
  centrality: Map<string, number>,
): void {
  const offenders: string[] = [];
  for (const id of ids) {
    if (!partition.has(id)) offenders.push(`${id} (missing from partition)`);
    if (!centrality.has(id)) offenders.push(`${id} (missing from centrality)`);
  }
  if (offenders.length > 0) {
    throw new ValidationError(`id mismatch between artifacts: ${offenders.join("; ")}`);
  }
}

export function renderNetwork(
  edges: EdgeRow[],
  partition: Map<string, number>,
  centrality: Map<string, number>,
  opts: NetworkOptions = {},
): RenderedNetwork {
  const width = opts.width ?? 800;
  const height = opts.height ?? 600;
  const iterations = opts.iterations ?? 300;
  const [minSize, maxSize] = opts.sizeRange ?? [4, 18];
  const margin = maxSize + 6;

  const ids = Array.from(new Set(edges.flatMap((e) => [e.src, e.dst]))).sort();
  checkIds(ids, partition, centrality);

  const nodes: LayoutNode[] = ids.map((id) => ({
    id,
    community: partition.get(id)!,
    score: centrality.get(id)!,
  }));
  const links: (SimulationLinkDatum<LayoutNode> & { weight: number })[] = edges.map((e) => ({
    source: e.src,
    target: e.dst,
    weight: e.weight,
  }));

  const simulation = forceSimulation(nodes)
    .force(
      "link",
      forceLink<LayoutNode, SimulationLinkDatum<LayoutNode>>(links)
        .id((d) => d.id)
        .distance(40),
    )
    .force("charge", forceManyBody().strength(-60))
    .force("center", forceCenter(0, 0))
    .stop();
  for (let i = 0; i < iterations; i++) {
    simulation.tick();
  }

  // Fit the layout into the viewport; a plain linear remap keeps the shape.
  const xs = nodes.map((n) => n.x!);
  const ys = nodes.map((n) => n.y!);
  const fit = (lo: number, hi: number, outLo: number, outHi: number) =>
    hi > lo
      ? scaleLinear().domain([lo, hi]).range([outLo, outHi])
      : () => (outLo + outHi) / 2;
  const fx = fit(Math.min(...xs), Math.max(...xs), margin, width - margin);
  const fy = fit(Math.min(...ys), Math.max(...ys), margin, height - margin);

  const scores = nodes.map((n) => n.score);
  const minScore = Math.min(...scores);
  const maxScore = Math.max(...scores);
  const size =
    maxScore > minScore
      ? scaleSqrt().domain([minScore, maxScore]).range([minSize, maxSize])
      : () => (minSize + maxSize) / 2;

  const colors = communityColors(nodes.map((n) => n.community));

  const out: NetworkNodeOut[] = nodes.map((n) => ({
    id: n.id,
    community: n.community,
    color: colors.get(n.community)!,
    score: n.score,
    size: size(n.score),
    x: Math.round(fx(n.x!) * 100) / 100,
    y: Math.round(fy(n.y!) * 100) / 100,
  }));
  const position = new Map(out.map((n) => [n.id, n]));

  const weights = links.map((l) => l.weight);
  const minW = Math.min(...weights);
  const maxW = Math.max(...weights);
  const strokeWidth =
    maxW > minW ? scaleLinear().domain([minW, maxW]).range([0.6, 2.5]) : () => 1;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
  );
  parts.push(`<rect width="100%" height="100%" fill="white"/>`);
  for (const link of links) {
    const s = position.get((link.source as LayoutNode).id)!;
    const t = position.get((link.target as LayoutNode).id)!;
    parts.push(
      `<line x1="${fmt(s.x)}" y1="${fmt(s.y)}" x2="${fmt(t.x)}" y2="${fmt(t.y)}" stroke="#999" stroke-opacity="0.5" stroke-width="${fmt(strokeWidth(link.weight))}"/>`,
    );
  }
  for (const n of out) {
    parts.push(
      `<circle cx="${fmt(n.x)}" cy="${fmt(n.y)}" r="${fmt(n.size)}" fill="${n.color}" stroke="white" stroke-width="0.8"><title>${esc(n.id)}</title></circle>`,
    );
  }
  parts.push(`</svg>`);

  return {
    svg: parts.join("\n") + "\n",
    sidecar: {
      kind: "network_layout",
      n_nodes: out.length,
      n_edges: links.length,
      nodes: out,
    },
  };
}

export function writeNetwork(
  edges: EdgeRow[],
  partition: Map<string, number>,
  centrality: Map<string, number>,
  outPath: string,
  opts: NetworkOptions = {},
): void {
  const rendered = renderNetwork(edges, partition, centrality, opts);
  fs.writeFileSync(outPath, rendered.svg);
  fs.writeFileSync(sidecarPath(outPath), JSON.stringify(rendered.sidecar, null, 2) + "\n");
}
