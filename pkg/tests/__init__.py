# SignedFlow Tests
