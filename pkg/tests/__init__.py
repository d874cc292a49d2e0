# Tests for gaiakit
