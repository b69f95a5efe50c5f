import logging
from async_adders.exceptions import CliError, ParseError
import json
import yaml


class FileHandler:
    def read(self, file_path: str, file_type="json") -> dict:
        """Load file from disk. Default is to load as a JSON file

        Args:
            file_path: Path to the file
            file_type: json, yaml or text

        Returns:
            Dictionary containing the parsed data OR raw contents
        """
        try:
            with open(file_path, "r") as f:
                if file_type == "json":
                    raw_file = json.load(f)
                elif file_type == "yaml":
                    raw_file = yaml.safe_load(f)
                else:
                    raw_file = f.read()
        except FileNotFoundError as e:
            logging.error(f"Could not find file at {file_path}.")
            raise ParseError(f"File not found: {file_path}") from e
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            logging.error(f"Could not parse {file_type} file at {file_path}: {e}")
            raise ParseError(f"Malformed {file_type} file: {file_path}") from e

        return raw_file

    def read_structured(self, file_path: str) -> dict:
        """Read a JSON or YAML file, picking the parser from the extension"""
        file_type = "yaml" if file_path.endswith((".yml", ".yaml")) else "json"
        return self.read(file_path, file_type=file_type)

    def write(self, file_path: str, contents: str):
        """Write contents to a file

        Args:
            file_path (str): destination path, overwritten if present
            contents (str): text to write

        Raises:
            CliError: the file could not be written
        """
        try:
            with open(file_path, "w") as f:
                f.truncate()  # Clear file to allow overwriting
                f.write(contents)
        except Exception as e:
            logging.error(f"Could not write file at {file_path}.")
            raise CliError("Could not write file") from e
