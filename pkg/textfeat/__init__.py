"""Post-content (M) feature extraction."""
