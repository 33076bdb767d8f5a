#!/usr/bin/env python3
"""Regenerate the bench corpus into a temp dir and diff it against the committed copy."""

import filecmp
import subprocess
import sys
import tempfile
from pathlib import Path


def tree(root):
    return sorted(p.relative_to(root) for p in Path(root).rglob("*") if p.is_file())


def main():
    generator, committed = sys.argv[1], Path(sys.argv[2])
    with tempfile.TemporaryDirectory() as tmp:
        fresh = Path(tmp) / "corpus"
        subprocess.run([sys.executable, generator, str(fresh)], check=True,
                       stdout=subprocess.DEVNULL)
        a, b = tree(committed), tree(fresh)
        if a != b:
            print("file sets differ:", sorted(set(a) ^ set(b))[:10])
            return 1
        bad = [str(p) for p in a if not filecmp.cmp(committed / p, fresh / p, shallow=False)]
        if bad:
            print("content differs:", bad[:10])
            return 1
        print(f"corpus matches generator ({len(a)} files)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
