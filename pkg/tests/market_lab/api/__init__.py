# Tests for API module
