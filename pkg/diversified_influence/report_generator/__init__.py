"""
Plaintext reports built from sections: free text, key-value summaries,
seed lists and tables.
"""

from .style import Style
from .report_sections import (
    ReportSection,
    TextBlockSection,
    KeyValueSection,
    SeedListSection,
    TableSection,
)
from .report_generator import ReportGenerator
