from mtpkit.cli import main

raise SystemExit(main())
