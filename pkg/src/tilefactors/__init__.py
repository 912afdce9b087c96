"""Analysis toolkit for one-dimensional substitution tilings."""
