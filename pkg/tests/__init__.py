"""Tests for curllambda."""
