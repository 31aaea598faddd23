from .random_elements import GENERATOR_VERSION, ElementGenerator
from .tabular import read_csv_rows, write_csv

__all__ = ["GENERATOR_VERSION", "ElementGenerator", "read_csv_rows", "write_csv"]
