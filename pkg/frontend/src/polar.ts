/**
 * Polar engagement plot: one sector per hashtag community, radius encoding
 * the engagement count, sectors grouped and colored by theme. The drawn
 * values go into a sidecar JSON so tests assert on data, not pixels.
 */
import * as fs from "fs";
import { arc } from "d3-shape";
import { scaleSqrt } from "d3-scale";
import { EngagementProfile, sidecarPath } from "./schema.js";
import { themeColor } from "./palette.js";

export interface PolarOptions {
  width?: number;
}

export interface PolarSectorOut {
  hashtag_community: number;
  theme: string;
  count: number;
  color: string;
  start_angle: number;
  end_angle: number;
  radius: number;
}

export interface PolarSidecar {
  kind: "polar_profile";
  user_community: number;
  size: number;
  sectors: PolarSectorOut[];
}

export interface RenderedFigure {
  svg: string;
  sidecar: PolarSidecar;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const fmt = (x: number) => (Math.round(x * 100) / 100).toString();

/**
 * Render one profile. Returns null (after a warning) for a profile with no
 * sectors; there is nothing to draw and no file should be written.
 */
export function renderPolar(
  profile: EngagementProfile,
  opts: PolarOptions = {},
): RenderedFigure | null {
  if (profile.sectors.length === 0) {
    console.warn(`empty profile for user community ${profile.user_community}, nothing to render`);
    return null;
  }

  const width = opts.width ?? 640;
  const cx = width / 2;
  const cy = width / 2 + 16;
  const radius = width / 2 - 72;

  // Sort so same-theme sectors sit next to each other; color by theme.
  const ordered = [...profile.sectors].sort((a, b) =>
    a.theme === b.theme ? a.hashtag_community - b.hashtag_community : a.theme < b.theme ? -1 : 1,
  );
  const themes = Array.from(new Set(ordered.map((s) => s.theme)));
  const colorOf = new Map(themes.map((t, i) => [t, themeColor(t, i)]));

  const maxCount = Math.max(...ordered.map((s) => s.count));
  const r = maxCount > 0 ? scaleSqrt().domain([0, maxCount]).range([0, radius]) : () => 0;
  const step = (2 * Math.PI) / ordered.length;
  const sectorArc = arc();

  const sectors: PolarSectorOut[] = ordered.map((s, i) => ({
    hashtag_community: s.hashtag_community,
    theme: s.theme,
    count: s.count,
    color: colorOf.get(s.theme)!,
    start_angle: i * step,
    end_angle: (i + 1) * step,
    radius: r(s.count),
  }));

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${width + 32}" viewBox="0 0 ${width} ${width + 32}">`,
  );
  parts.push(`<rect width="100%" height="100%" fill="white"/>`);
  parts.push(
    `<text x="12" y="20" font-family="sans-serif" font-size="13">user community ${profile.user_community} (${profile.size} users)</text>`,
  );
  parts.push(`<g transform="translate(${fmt(cx)},${fmt(cy)})">`);
  for (const frac of [0.25, 0.5, 0.75, 1.0]) {
    parts.push(
      `<circle r="${fmt(radius * frac)}" fill="none" stroke="#ddd" stroke-width="1"/>`,
    );
  }
  for (const s of sectors) {
    const path = sectorArc({
      innerRadius: 0,
      outerRadius: s.radius,
      startAngle: s.start_angle,
      endAngle: s.end_angle,
    });
    parts.push(
      `<path class="sector" d="${path}" fill="${s.color}" fill-opacity="0.85" stroke="white" stroke-width="0.5"/>`,
    );
    const mid = (s.start_angle + s.end_angle) / 2;
    const lx = (radius + 14) * Math.sin(mid);
    const ly = -(radius + 14) * Math.cos(mid);
    parts.push(
      `<text x="${fmt(lx)}" y="${fmt(ly)}" font-family="sans-serif" font-size="10" text-anchor="middle" dominant-baseline="middle">${s.hashtag_community}</text>`,
    );
  }
  parts.push(`</g>`);
  // Theme legend along the bottom edge.
  themes.forEach((t, i) => {
    const x = 12 + i * 150;
    const y = width + 18;
    parts.push(`<rect x="${x}" y="${y - 9}" width="10" height="10" fill="${colorOf.get(t)}"/>`);
    parts.push(
      `<text x="${x + 14}" y="${y}" font-family="sans-serif" font-size="11">${esc(t)}</text>`,
    );
  });
  parts.push(`</svg>`);

  return {
    svg: parts.join("\n") + "\n",
    sidecar: {
      kind: "polar_profile",
      user_community: profile.user_community,
      size: profile.size,
      sectors,
    },
  };
}

/** Render and write image plus sidecar; returns false on the empty no-op. */
export function writePolar(
  profile: EngagementProfile,
  outPath: string,
  opts: PolarOptions = {},
): boolean {
  const rendered = renderPolar(profile, opts);
  if (rendered === null) {
    return false;
  }
  fs.writeFileSync(outPath, rendered.svg);
  fs.writeFileSync(sidecarPath(outPath), JSON.stringify(rendered.sidecar, null, 2) + "\n");
  return true;
}
