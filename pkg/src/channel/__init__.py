"""Rician channel draws for the TX-RIS and RIS-RX links."""
