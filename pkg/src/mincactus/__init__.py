"""Cactus representations of Steiner minimum cuts in graphs and hypergraphs."""
