"""Surface syntax: lexer, parser and printer."""
