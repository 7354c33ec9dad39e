from carlab_runner.commands import carlab


def main():
    carlab()


if __name__ == "__main__":
    main()
