"""User-related (U-P, U-HA, U-HM) feature extraction."""
