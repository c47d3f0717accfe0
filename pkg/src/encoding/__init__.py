"""Classical-to-quantum feature encodings."""
