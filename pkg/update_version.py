#!/usr/bin/env python3
"""
Update the version number in the package and in pyproject.toml
"""
import re
import sys
from pathlib import Path


def update_package_version(major, minor, patch):
    """Rewrite __version__ in totlab/__init__.py"""
    init_file = Path("totlab") / "__init__.py"
    content = init_file.read_text(encoding="utf-8")
    content = re.sub(
        r'__version__ = "[^"]*"', f'__version__ = "{major}.{minor}.{patch}"', content
    )
    init_file.write_text(content, encoding="utf-8")
    print(f"Updated {init_file}")


def update_pyproject_toml(major, minor, patch, build=0):
    """Update pyproject.toml with new version"""
    pyproject_file = Path("pyproject.toml")
    content = pyproject_file.read_text(encoding="utf-8")

    version_string = f"{major}.{minor}.{patch}.{build}"
    content = re.sub(
        r'^version = "[^"]*"', f'version = "{version_string}"', content, flags=re.MULTILINE
    )

    pyproject_file.write_text(content, encoding="utf-8")
    print(f"Updated {pyproject_file}")


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) < 3:
        print("Usage: python update_version.py <major> <minor> <patch> [build]")
        print("Example: python update_version.py 0 3 1")
        return 1

    try:
        major, minor, patch = (int(v) for v in argv[:3])
        build = int(argv[3]) if len(argv) > 3 else 0
    except ValueError:
        print("Error: Version numbers must be integers")
        return 1

    print(f"Updating version to: {major}.{minor}.{patch}.{build}")
    print("-" * 40)
    update_package_version(major, minor, patch)
    update_pyproject_toml(major, minor, patch, build)
    print("-" * 40)
    print("Next steps:")
    print("  1. Run the tests: uv run pytest")
    print("  2. Build the executable: uv run python build.py")
    return 0


if __name__ == "__main__":
    sys.exit(main())
