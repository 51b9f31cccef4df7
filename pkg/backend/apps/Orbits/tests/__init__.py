"""Tests for the Orbits app."""
