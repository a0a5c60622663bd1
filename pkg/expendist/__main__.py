from expendist.app import main

raise SystemExit(main())
