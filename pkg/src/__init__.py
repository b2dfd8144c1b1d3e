"""
Weak Tomography
Qubit state tomography with sequential weak measurements and state recycling
"""

__version__ = "0.1.0"
