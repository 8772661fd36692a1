// GENERATED by scripts/gen_palette.py - do not edit by hand.
// Bin 0 is cold (white), bin 15 is hot (red).
export const PALETTE: readonly string[] = [
  "#ffffff",
  "#fdf5d9",
  "#fbecb3",
  "#f9e28e",
  "#f7d868",
  "#f5ce42",
  "#f3c41c",
  "#f1ba17",
  "#efa90f",
  "#ed9807",
  "#eb8700",
  "#e06c00",
  "#d55200",
  "#ca3700",
  "#bf1d00",
  "#b40202",
] as const;
