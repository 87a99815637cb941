"""Power-splitting energy harvesting for reconfigurable intelligent surfaces."""

__version__ = "0.1.0"
