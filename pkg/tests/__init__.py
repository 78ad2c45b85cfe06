# Tests for Agent Messaging Protocol
# Unit tests for all components

__all__ = []
