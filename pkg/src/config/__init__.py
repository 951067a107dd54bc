"""
Configuration management.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
env_path = Path(__file__).parent.parent.parent / ".env"
load_dotenv(env_path)

# Segment cache (unset disables caching)
CACHE_DIR = os.getenv("D3_CACHE_DIR") or None

# Working precision for jets and series, in significant decimal digits
PRECISION_DIGITS = int(os.getenv("D3_PRECISION_DIGITS", "30"))

# Sieve memory budget: one segment holds SEGMENT_SIZE entries
SEGMENT_SIZE = int(os.getenv("D3_SEGMENT_SIZE", str(2**22)))
SEGMENT_COUNT = int(os.getenv("D3_SEGMENT_COUNT", "64"))

# Upper limit for d3_partial_sum
PARTIAL_SUM_LIMIT = int(os.getenv("D3_PARTIAL_SUM_LIMIT", str(10**9)))

# Worker pool size
WORKERS = int(os.getenv("D3_WORKERS", "1"))

# Logging
LOG_LEVEL = os.getenv("D3_LOG_LEVEL", "INFO")

