"""Counter automata on finite and infinite words, and separators for
omega-B and omega-S regular languages."""
