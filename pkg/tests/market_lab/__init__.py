# Tests for market_lab
