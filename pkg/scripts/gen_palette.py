"""Generate the frontend's vendored palette module and canonicalization
fixtures from the Python package (the single source of truth).

    python3 scripts/gen_palette.py          # (re)write the files
    python3 scripts/gen_palette.py --check  # fail if anything is out of date
"""
import json
import sys
from pathlib import Path

from voxelastic.heatmap import PALETTE
from voxelastic.server import canonical_world_bytes
from voxelastic.world import World

ROOT = Path(__file__).resolve().parent.parent
PALETTE_TS = ROOT / "frontend" / "src" / "palette.ts"
FIXTURE_DIR = ROOT / "frontend" / "test" / "fixtures"

FIXTURE_WORLD = {
    "ground_level": 0,
    "blocks": [
        {"x": 2, "y": 1, "z": 0, "kind": "load"},
        {"x": 0, "y": 0, "z": 0, "kind": "structural"},
        {"x": -1, "y": 3, "z": 5, "kind": "fixed"},
        {"x": 2, "y": 0, "z": 0, "kind": "structural"},
    ],
}


def palette_ts() -> str:
    colors = ",\n".join(f'  "{c}"' for c in PALETTE)
    return (
        "// GENERATED by scripts/gen_palette.py - do not edit by hand.\n"
        "// Bin 0 is cold (white), bin 15 is hot (red).\n"
        "export const PALETTE: readonly string[] = [\n"
        f"{colors},\n"
        "] as const;\n"
    )


def main() -> int:
    check = "--check" in sys.argv
    canonical = canonical_world_bytes(World.from_dict(FIXTURE_WORLD)).decode("utf-8")
    outputs = {
        PALETTE_TS: palette_ts(),
        FIXTURE_DIR / "world.input.json": json.dumps(FIXTURE_WORLD, indent=2) + "\n",
        FIXTURE_DIR / "world.canonical.json": canonical + "\n",
    }
    stale = []
    for path, content in outputs.items():
        if check:
            if not path.exists() or path.read_text(encoding="utf-8") != content:
                stale.append(str(path))
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(content, encoding="utf-8")
            print(f"wrote {path}")
    if stale:
        print("out of date: " + ", ".join(stale), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
