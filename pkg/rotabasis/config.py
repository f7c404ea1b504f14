import os

from dotenv import load_dotenv

load_dotenv()

# Worker cap for parallel evaluation and search (CLI --threads overrides it)
THREADS = int(os.getenv("ROTABASIS_THREADS", str(os.cpu_count() or 1)))

# Resource guards
TERM_CAP = int(os.getenv("ROTABASIS_TERM_CAP", "50000000"))
ATDIFF_MAX_N = int(os.getenv("ROTABASIS_ATDIFF_MAX_N", "5"))
SEARCH_NODE_CAP = int(os.getenv("ROTABASIS_SEARCH_NODE_CAP", "5000000"))

# Support size up to which diagonal_lower_bound searches exactly
EXACT_DIAGONAL_LIMIT = int(os.getenv("ROTABASIS_EXACT_DIAGONAL_LIMIT", "20"))

# Semistability search defaults
SAMPLE_BUDGET = int(os.getenv("ROTABASIS_SAMPLE_BUDGET", "1000"))
SEED = int(os.getenv("ROTABASIS_SEED", "0"))

LOG_LEVEL = os.getenv("ROTABASIS_LOG_LEVEL", "WARNING")
