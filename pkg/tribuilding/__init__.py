"""Triangle buildings from triangle presentations over PG(2,q)."""
