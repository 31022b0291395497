"""Command-line surface: document schemas, logging setup and subcommands."""
