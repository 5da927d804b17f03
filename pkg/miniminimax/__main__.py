# -*- coding: utf-8 -*-
#
# miniminimax : mini-minimax uncertainty bounds for emulators
# License : BSD-3-Clause

"""
miniminimax
~~~~~~~~~~~

bound the potential error of any emulator trained on observations of f
"""

import os
import platform
import sys


def main():
    """ Set up args and start the miniminimax manager """
    from . import helpers, manager

    parser = helpers.setup_parser()
    args = parser.parse_args()

    return manager.start(args)


def init():
    """ Handle main init """
    # hard set no support for python < v3.9
    if sys.version_info < (3, 9):
        sys.exit(
            "{0} requires Python version 3.9 or higher...\nyou are trying to run with Python version {1}...\nexiting...".format(
                os.path.basename(__file__), platform.python_version()
            )
        )

    if __name__ == "__main__":
        sys.exit(main())


init()
