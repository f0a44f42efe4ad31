"""Tests package for impatient-queue."""
