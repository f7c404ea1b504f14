import sys
from pathlib import Path

# Make `rotabasis` and `tests` importable without installing the package
sys.path.insert(0, str(Path(__file__).parent))
