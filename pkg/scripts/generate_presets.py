"""Regenerate the shipped .qdl presets from their builders."""
from pathlib import Path

from qdeform.exotic.preset_sources import PRESET_BUILDERS

OUT = Path(__file__).resolve().parents[1] / "src" / "qdeform" / "presets"


def main():
    OUT.mkdir(exist_ok=True)
    for name, build in PRESET_BUILDERS.items():
        path = OUT / f"{name}.qdl"
        path.write_text(build())
        print(f"wrote {path.relative_to(OUT.parents[2])}")


if __name__ == "__main__":
    main()
