"""Configuration module for PeriodLab.

This module contains the numeric caps, budgets, environment variable names
and log emoji shared by every layer.
"""

import os

# Application constants
APP_NAME = "PeriodLab"

# Brute-force guards
ENUMERATION_CAP = 2**20
BRANCH_BUDGET = 10**5
DEFAULT_MAX_ITER = 10**6
SIEVE_CAP = 10**7
EC_COUNT_CAP = 10**6
EC_STRUCTURE_CAP = 10**4
UNBOUNDEDNESS_K_MAX = 64

# Factorization budget
TRIAL_DIVISION_LIMIT = 10**6
RHO_RETRIES = 8
RHO_MAX_STEPS = 10**6
FACTOR_BIT_LIMIT = 2048
DETERMINISTIC_PRIMALITY_BOUND = 2**64

# Default precision is DEFAULT_PRECISION_FACTOR * e
DEFAULT_PRECISION_FACTOR = 6

# The periodic point search works modulo pi^(SEARCH_PRECISION_FACTOR * N)
SEARCH_PRECISION_FACTOR = 3

# Environment overrides
THREADS_ENV = "PERIODLAB_THREADS"
ENUMERATION_CAP_ENV = "PERIODLAB_ENUMERATION_CAP"
BRANCH_BUDGET_ENV = "PERIODLAB_BRANCH_BUDGET"
DEFAULT_THREADS = min(4, os.cpu_count() or 1)

# Report formats
REPORT_FORMATS = ("json", "csv", "markdown", "xlsx")
DETERMINISTIC_FORMATS = ("json", "csv", "markdown")

# Log emoji
LOG_EMOJI_LOADING = "📥"
LOG_EMOJI_DATA = "📊"
LOG_EMOJI_PROGRESS = "🔄"
LOG_EMOJI_TARGET = "🎯"
LOG_EMOJI_SUCCESS = "✅"
LOG_EMOJI_ERROR = "❌"
LOG_EMOJI_WARNING = "⚠️"
LOG_EMOJI_DIAGNOSTIC = "🔍"
