"""
Storage Module - Files and Run History

- bank_store: filter-bank and sampled-function JSON files
- run_log: audit trail of certification runs
"""

from .bank_store import load_bank, load_sampled, save_bank, save_sampled
from .run_log import RunLog

__all__ = ['load_bank', 'load_sampled', 'save_bank', 'save_sampled', 'RunLog']
