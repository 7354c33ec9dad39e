SMALL_GRID = ["--nx", "40", "--nt", "200"]


def cli_args(command: str, output_dir, *extra: str, grid=SMALL_GRID) -> list[str]:
    return [command, *grid, "--output-dir", str(output_dir), *extra]
