"""Instance generation, theorem registry, suite runner and reports."""
