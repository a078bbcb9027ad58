import os


def get_data_path() -> str:
    return os.path.join(os.path.dirname(__file__))
