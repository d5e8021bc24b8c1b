// Shared color assignment. Theme names coming out of the engine's theme
// stage get fixed colors so figures stay comparable across runs; anything
// else falls back to the categorical cycle.

export const CATEGORICAL = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
  "#bcbd22",
  "#17becf",
];

const THEME_COLORS: Record<string, string> = {
  political: "#d62728",
  football: "#1f77b4",
  uk_location: "#2ca02c",
  other: "#7f7f7f",
};

export function themeColor(theme: string, fallbackIndex: number): string {
  return THEME_COLORS[theme] ?? CATEGORICAL[fallbackIndex % CATEGORICAL.length];
}

/** Stable community -> color map over the sorted distinct community ids. */
export function communityColors(communities: Iterable<number>): Map<number, string> {
  const distinct = Array.from(new Set(communities)).sort((a, b) => a - b);
  const out = new Map<number, string>();
  distinct.forEach((community, i) => {
    out.set(community, CATEGORICAL[i % CATEGORICAL.length]);
  });
  return out;
}
