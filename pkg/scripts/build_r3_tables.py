"""Rewrite the triangle-move tables under src/khcob/r3_tables."""
from khcob.r3 import TABLE_DIR, TABLE_WORDS, VARIANTS, table_path, variant_table

TABLE_DIR.mkdir(exist_ok=True)
for name, word in TABLE_WORDS.items():
    for variant in VARIANTS:
        header = f"# triangle move, {name} crossings, resolving the {variant} crossing\n"
        table_path(name, variant).write_text(header + variant_table(word, variant))
        print(table_path(name, variant))
