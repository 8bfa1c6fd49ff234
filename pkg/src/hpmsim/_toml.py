try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

loads = tomllib.loads
TOMLDecodeError = tomllib.TOMLDecodeError
