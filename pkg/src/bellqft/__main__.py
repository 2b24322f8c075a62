from bellqft.cli import main

main()
