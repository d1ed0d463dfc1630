"""SignedFlow Package Tests"""
