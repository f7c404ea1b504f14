"""Command routers: each module registers its subcommands on the shared parser."""
