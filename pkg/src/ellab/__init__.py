"""ellab: numerical laboratory for Liouville-type theorems of semilinear elliptic problems."""
