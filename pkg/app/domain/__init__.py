"""Domain types shared by the numerical library, the managers and the output layer."""
