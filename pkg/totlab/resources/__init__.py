# totlab resources package

import json
import os
import sys

from ..errors import ConfigurationError


def resource_path(name):
    """Locate a shipped resource file, from source or from a PyInstaller bundle."""
    candidates = [
        os.path.join(os.path.dirname(os.path.abspath(__file__)), name),
        (
            os.path.join(sys._MEIPASS, "totlab", "resources", name)
            if hasattr(sys, "_MEIPASS")
            else None
        ),
    ]

    for path in candidates:
        if path and os.path.exists(path):
            return path

    raise ConfigurationError(f"resource {name!r} not found")


def read_json_resource(name):
    with open(resource_path(name), "r", encoding="utf-8") as file:
        return json.load(file)
