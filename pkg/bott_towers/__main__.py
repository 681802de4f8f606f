from bott_towers.cli import main

if __name__ == "__main__":
    main()
