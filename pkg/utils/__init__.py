"""
Utility modules for numra: report export and plot data.
"""

from utils.plot_data import PlotDataExporter
from utils.report_export import CertificationReport, ReportWriter, save_report

__all__ = ['PlotDataExporter', 'CertificationReport', 'ReportWriter', 'save_report']
