"""Test suite for the FC Affine Enumerator."""
