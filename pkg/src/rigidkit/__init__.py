"""Generic matroids on graphs via randomized prime-field rank."""
