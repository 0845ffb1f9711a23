# version.py

VERSION = "0.3.0"
AUTHOR = "Rong Zhu"
DATE = "October 18, 2026"
