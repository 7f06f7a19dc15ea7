class IsoldeException(Exception):
    """Common base exception"""

    pass


class IsoldeValidationError(IsoldeException):
    """Error caused by invalid input

    Attributes:
        pointer (str): JSON pointer of the offending value, if known
        violations (list[str]): every violated constraint, if more than one was found
    """

    def __init__(self, message="", pointer=None, violations=None):
        super().__init__(message)
        self.pointer = pointer
        self.violations = list(violations or [])


class IsoldeProgrammingError(IsoldeException):
    """Error caused by misuse of isolde"""

    pass


class IsoldeCapacityError(IsoldeException):
    """Error caused by an exhaustive construction exceeding its configured capacity"""

    pass


class IsoldeResourceError(IsoldeException):
    """Error caused by the exploration budget running out before a verdict"""

    pass
