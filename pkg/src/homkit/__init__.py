"""homkit — graded commutative algebra, local cohomology and sheaf cohomology scripts."""
