import sys

from baselines.threads import pin_blas_threads

if sys.argv[1:2] == ["bench"]:
    pin_blas_threads()

from cli.main import main  # noqa: E402

main()
