"""
SignedFlow Core
Graph model, flow arithmetic, constructions and the exhaustive oracle
"""
