#!/usr/bin/env python3
"""
labelswitch - Relabelling Algorithms for Label Switching
========================================================

Undoes label switching in MCMC output from finite mixtures and hidden
Markov models, and compares the relabelling methods through single best
clusterings and a similarity matrix.

Usage:
    python main.py relabel --method STEPHENS,ECR --p p.lsa --z z.lsa --zpivot zp.lsa --out-dir out
    python main.py simulate --preset separated-normal --seed 1 --out-dir fixture
    python main.py inject --in-dir fixture --out-dir switched --seed 2
    python main.py permute --mcmc mcmc.lsa --permutations out/permutations_ECR.lsa --out mcmc_ECR.lsa
    python main.py map-pivot --model normal --mcmc mcmc.lsa --z z.lsa --data data.lsa
    python main.py serve             # MCP server (stdio)
    python main.py self-test         # Quick smoke suite

Environment Variables:
    LABELSWITCH_DEBUG=true           # Enable debug logging
    LABELSWITCH_THREADS=4            # Default worker threads
    LABELSWITCH_THR_ECR=1e-6         # Default thresholds (also _THR_STE, _THR_SJW)

Requirements:
    pip install -r requirements.txt
"""

import sys

from labelswitch.cli.main import main


if __name__ == "__main__":
    sys.exit(main())
